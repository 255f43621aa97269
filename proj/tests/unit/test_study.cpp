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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <set>
#include <string>

#include <json.hpp>

#include "fixtures.hpp"
#include "lanewatch/common/io.hpp"
#include "lanewatch/monitor/calibration.hpp"
#include "lanewatch/sim/episode.hpp"
#include "lanewatch/study/commands.hpp"
#include "lanewatch/study/config.hpp"

namespace fs = std::filesystem;
using namespace lanewatch;
using namespace lanewatch::study;

namespace {

const char* kTinyConfig = R"({
  "seed": 7,
  "dropout_rates": [0.05],
  "driver_dropout_rate": 0.05,
  "member_seeds": [1, 2, 3, 4, 5],
  "estimators": [
    {"id": "de3", "kind": "de", "members": 3, "gamma": 0.999},
    {"id": "mcd", "kind": "mcd", "dropout_rate": 0.05, "samples": 8, "gamma": 0.99},
    {"id": "ae", "kind": "ae", "gamma": 0.99}
  ],
  "benchmarks": [
    {"id": "ood-extreme", "tier": "extreme",
     "corruptions": [{"kind": "additive-noise", "intensity": 1.2}]},
    {"id": "mutants", "tier": "nominal",
     "mutation": {"kind": "weight-gaussian-fuzz", "magnitude": 0.05}}
  ],
  "episode_seeds": [1, 2],
  "episode_steps": 800,
  "calibration_steps": 2000,
  "evaluation": {"ttf": [1, 2, 3], "confidences": [0.95, 0.99, 0.999]},
  "bench": {"ensemble_sizes": [2, 5], "mcd_samples": [2, 4], "inputs": 150, "warmup": 50, "repetitions": 1}
})";

StudyConfig tiny() { return parse_study_config(kTinyConfig); }

nlohmann::json tiny_json() { return nlohmann::json::parse(kTinyConfig); }

StudyConfig tiny_with(const std::function<void(nlohmann::json&)>& edit) {
  auto j = tiny_json();
  edit(j);
  return parse_study_config(j.dump());
}

RunOptions options(const fs::path& out) {
  RunOptions opt;
  opt.out = out;
  return opt;
}

std::string config_error(const std::function<void(nlohmann::json&)>& edit) {
  try {
    tiny_with(edit);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "config accepted";
  return {};
}

void copy_tree(const fs::path& from, const fs::path& to) {
  fs::remove_all(to);
  fs::copy(from, to, fs::copy_options::recursive);
}

}  // namespace

TEST(StudyConfig, TinyConfigParses) {
  const auto cfg = tiny();
  EXPECT_EQ(cfg.estimators.size(), 3u);
  EXPECT_EQ(cfg.benchmarks.size(), 2u);
  EXPECT_TRUE(cfg.benchmark("mutants").is_mutant());
  EXPECT_EQ(cfg.estimator("mcd").samples, 8);
  EXPECT_ERROR_KIND(cfg.estimator("nope"), ErrorKind::kConfig);
}

TEST(StudyConfig, ShippedConfigLoads) {
  const auto cfg = load_study_config(fs::path(LANEWATCH_SOURCE_DIR) / "configs" / "study.json");
  EXPECT_EQ(cfg.estimators.size(), 3u);
  EXPECT_EQ(cfg.benchmarks.size(), 3u);
  EXPECT_EQ(cfg.eval.ttf_list, (std::vector<int>{1, 2, 3}));
}

TEST(StudyConfig, UnknownKeysRejected) {
  EXPECT_NE(config_error([](auto& j) { j["sed"] = 1; }).find("sed"), std::string::npos);
  config_error([](auto& j) { j["estimators"][0]["member"] = 3; });
  config_error([](auto& j) { j["bench"]["input"] = 3; });
}

TEST(StudyConfig, DisregardedDropoutRateRejected) {
  const auto msg = config_error([](auto& j) {
    j["dropout_rates"] = {0.05, 0.45};
  });
  EXPECT_NE(msg.find("disregarded rate"), std::string::npos) << msg;
}

TEST(StudyConfig, ReservedBenchmarkIds) {
  config_error([](auto& j) { j["benchmarks"][0]["id"] = "nominal"; });
  config_error([](auto& j) { j["benchmarks"][0]["id"] = "all"; });
}

TEST(StudyConfig, RatesMustBeTrained) {
  config_error([](auto& j) { j["driver_dropout_rate"] = 0.1; });
  config_error([](auto& j) { j["estimators"][1]["dropout_rate"] = 0.1; });
  EXPECT_NO_THROW(tiny_with([](auto& j) { j["estimators"][2]["dropout_rate"] = 0.3; }));
}

TEST(StudyConfig, EstimatorConsistency) {
  config_error([](auto& j) { j["estimators"][0]["members"] = 6; });
  config_error([](auto& j) { j["estimators"][1]["id"] = "de3"; });
  config_error([](auto& j) { j["estimators"][0]["kind"] = "bagging"; });
}

TEST(StudyConfig, MalformedJson) { EXPECT_ERROR_KIND(parse_study_config("{\"seed\": "), ErrorKind::kParse); }

class StudyPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = lanewatch::testing::scratch_dir("study");
    const auto cfg = tiny();
    const auto opt = options(root_ / "run");
    cmd_train(cfg, opt);
    cmd_simulate(cfg, opt);
    cmd_calibrate(cfg, opt);
    cmd_evaluate(cfg, opt);
  }

  static fs::path run() { return root_ / "run"; }

  static inline fs::path root_;
};

TEST_F(StudyPipeline, TrainWritesModels) {
  const auto cfg = tiny();
  const Layout layout(cfg, run());
  EXPECT_TRUE(fs::exists(layout.mcd_model(0.05)));
  for (std::uint64_t s = 1; s <= 5; ++s) EXPECT_TRUE(fs::exists(layout.member_model(s))) << s;
  EXPECT_TRUE(fs::exists(layout.autoencoder_model()));
  EXPECT_TRUE(fs::exists(layout.ensemble_manifest(cfg.estimator("de3"))));
  const auto log = nlohmann::json::parse(read_file(layout.solidity_log()));
  EXPECT_FALSE(log.empty());
}

TEST_F(StudyPipeline, TrainIsDeterministic) {
  const auto cfg = tiny();
  const auto again = root_ / "again";
  fs::remove_all(again);
  cmd_train(cfg, options(again));
  const Layout a(cfg, run());
  const Layout b(cfg, again);
  EXPECT_EQ(read_file(a.mcd_model(0.05)), read_file(b.mcd_model(0.05)));
  for (std::uint64_t s = 1; s <= 5; ++s) EXPECT_EQ(read_file(a.member_model(s)), read_file(b.member_model(s)));
  EXPECT_EQ(read_file(a.autoencoder_model()), read_file(b.autoencoder_model()));
  EXPECT_EQ(read_file(a.solidity_log()), read_file(b.solidity_log()));
}

TEST_F(StudyPipeline, SimulateWritesTraces) {
  const auto cfg = tiny();
  const Layout layout(cfg, run());
  for (const auto& e : cfg.estimators) {
    for (const auto& b : cfg.benchmarks) {
      EXPECT_TRUE(fs::exists(layout.calibration_trace(e.id, b.id)));
      for (auto s : cfg.episode_seeds) {
        const auto trace = sim::load_trace(layout.episode_trace(e.id, b.id, s));
        EXPECT_EQ(trace.meta.estimator_id, e.id);
        EXPECT_EQ(trace.meta.benchmark, b.id);
        EXPECT_FALSE(trace.is_nominal());
        EXPECT_LE(trace.records.size(), cfg.episode_steps);
      }
      EXPECT_TRUE(fs::exists(layout.calibration(e.id, b.id)));
    }
    for (auto s : cfg.episode_seeds) EXPECT_TRUE(sim::load_trace(layout.nominal_trace(e.id, s)).is_nominal());
  }
}

TEST_F(StudyPipeline, ReportGrid) {
  const auto report = eval::load_report(run() / "reports" / "report.json");
  // per estimator and confidence: 2 benchmarks x (3 TTF + avg) + all x (3 TTF + avg)
  EXPECT_EQ(report.rows.size(), 3u * 3u * (2u * 4u + 4u));
  EXPECT_EQ(report.sources.size(), 3u * 2u);
  for (const auto& src : report.sources) {
    EXPECT_FALSE(src.models.empty());
    EXPECT_EQ(src.traces.size(), 4u);  // 2 nominal + 2 benchmark episodes
    EXPECT_TRUE(fs::exists(run() / src.calibration)) << src.calibration;
  }
  EXPECT_TRUE(fs::exists(run() / "reports" / "report.csv"));
  EXPECT_TRUE(fs::exists(run() / "reports" / "table.csv"));
}

TEST_F(StudyPipeline, EvaluateIsByteIdentical) {
  const auto cfg = tiny();
  const auto before = read_file(run() / "reports" / "report.json");
  cmd_evaluate(cfg, options(run()));
  EXPECT_EQ(read_file(run() / "reports" / "report.json"), before);
}

TEST_F(StudyPipeline, StaleCalibrationDetected) {
  const auto cfg = tiny();
  const auto copy = root_ / "stale";
  copy_tree(run(), copy);
  const Layout layout(cfg, copy);
  const auto path = layout.calibration_trace("ae", "mutants");
  auto trace = sim::load_trace(path);
  trace.records.front().score += 1.0;
  sim::save_trace(trace, path);
  try {
    cmd_evaluate(cfg, options(copy));
    FAIL() << "stale calibration accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIntegrity);
    EXPECT_NE(std::string(e.what()).find("rerun calibrate"), std::string::npos) << e.what();
  }
}

TEST_F(StudyPipeline, WindowMismatchDetected) {
  const auto cfg = tiny();
  const auto copy = root_ / "window";
  copy_tree(run(), copy);
  const Layout layout(cfg, copy);
  const auto path = layout.calibration("mcd", "ood-extreme");
  auto art = monitor::load_calibration(path);
  art.window_len_frames += 3;
  monitor::save_calibration(art, path);
  try {
    cmd_evaluate(cfg, options(copy));
    FAIL() << "window mismatch accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
    EXPECT_NE(std::string(e.what()).find("window length mismatch"), std::string::npos) << e.what();
  }
}

TEST_F(StudyPipeline, MissingArtifactsAreActionable) {
  const auto cfg = tiny();
  const auto copy = root_ / "missing";
  copy_tree(run(), copy);
  const Layout layout(cfg, copy);
  fs::remove(layout.calibration("de3", "mutants"));
  try {
    cmd_evaluate(cfg, options(copy));
    FAIL() << "missing calibration accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
    EXPECT_NE(std::string(e.what()).find("run calibrate first"), std::string::npos) << e.what();
  }

  fs::remove(layout.member_model(2));
  try {
    cmd_simulate(cfg, options(copy));
    FAIL() << "missing member accepted";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("member-2.model"), std::string::npos) << e.what();
  }
}

TEST_F(StudyPipeline, EvaluateNeedsTraces) {
  const auto cfg = tiny();
  const auto empty = root_ / "empty";
  fs::remove_all(empty);
  EXPECT_ERROR_KIND(cmd_evaluate(cfg, options(empty)), ErrorKind::kIo);
  EXPECT_ERROR_KIND(cmd_simulate(cfg, options(empty)), ErrorKind::kIo);
}

TEST_F(StudyPipeline, CompareWritesPairs) {
  const auto cfg = tiny();
  const auto cmp = cmd_compare(cfg, options(run()));
  EXPECT_EQ(cmp.size(), 3u);
  for (const auto& c : cmp) {
    EXPECT_GE(c.test.p_value, 0.0);
    EXPECT_LE(c.test.p_value, 1.0);
  }
  EXPECT_TRUE(fs::exists(run() / "reports" / "compare.json"));
}

TEST(StudyBench, SerialAndParallelRows) {
  const auto cfg = tiny();
  const auto out = lanewatch::testing::scratch_dir("study-bench");
  const auto reports = cmd_bench(cfg, options(out));
  std::set<std::pair<std::size_t, std::string>> de;
  std::set<std::size_t> mcd;
  for (const auto& r : reports) {
    EXPECT_GT(r.median_ms, 0.0);
    if (r.estimator.rfind("de", 0) == 0) de.emplace(r.size, r.mode);
    if (r.estimator.rfind("mcd", 0) == 0) mcd.insert(r.size);
  }
  for (std::size_t n : cfg.bench.ensemble_sizes) {
    EXPECT_TRUE(de.count({n, "serial"})) << n;
    EXPECT_TRUE(de.count({n, "parallel"})) << n;
  }
  EXPECT_EQ(mcd, (std::set<std::size_t>{2, 4}));
  EXPECT_TRUE(fs::exists(out / "bench" / "bench.json"));
  EXPECT_TRUE(fs::exists(out / "bench" / "bench.csv"));
}

class Cli : public ::testing::Test {
 protected:
  static int run(const std::string& args) {
    const std::string cmd = std::string("\"") + LANEWATCH_CLI + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
};

TEST_F(Cli, ExitCodes) {
  const auto dir = lanewatch::testing::scratch_dir("cli");
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("train --bogus"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("evaluate --gamma 1.5"), 2);
  EXPECT_EQ(run("train --config " + (dir / "absent.json").string()), 3);
  write_file_atomic(dir / "bad.json", "{\"seed\": 1, \"unknown\": 2}");
  EXPECT_EQ(run("train --config " + (dir / "bad.json").string()), 2);
  write_file_atomic(dir / "tiny.json", kTinyConfig);
  EXPECT_EQ(run("evaluate --config " + (dir / "tiny.json").string() + " --out " + (dir / "out").string()), 3);
}
